#include <setjmp.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include <jpeglib.h>

struct err_mgr {
  struct jpeg_error_mgr pub;
  jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

static void on_error(j_common_ptr cinfo) {
  struct err_mgr *err = (struct err_mgr *)cinfo->err;
  (*cinfo->err->format_message)(cinfo, err->message);
  longjmp(err->jump, 1);
}

static void on_message(j_common_ptr cinfo) { (void)cinfo; }

/* Decodes to interleaved RGB (3 channels) or gray (1 channel) without
 * fancy upsampling. Returns 0 on success; *out must be freed with
 * refdec_free. */
int refdec_decode_pixels(const unsigned char *data, unsigned long len,
                         int want_rgb, int float_idct, unsigned char **out, int *width,
                         int *height, int *channels, char *msg, int msg_len) {
  struct jpeg_decompress_struct cinfo;
  struct err_mgr err;
  unsigned char *volatile buffer = NULL;

  cinfo.err = jpeg_std_error(&err.pub);
  err.pub.error_exit = on_error;
  err.pub.output_message = on_message;
  if (setjmp(err.jump)) {
    snprintf(msg, msg_len, "%s", err.message);
    jpeg_destroy_decompress(&cinfo);
    free(buffer);
    return 1;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, data, len);
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = want_rgb ? JCS_RGB : JCS_GRAYSCALE;
  cinfo.do_fancy_upsampling = FALSE;
  cinfo.do_block_smoothing = FALSE;
  cinfo.dct_method = float_idct ? JDCT_FLOAT : JDCT_ISLOW;
  jpeg_start_decompress(&cinfo);

  size_t stride = (size_t)cinfo.output_width * cinfo.output_components;
  buffer = malloc(stride * cinfo.output_height);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = buffer + stride * cinfo.output_scanline;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  *width = cinfo.output_width;
  *height = cinfo.output_height;
  *channels = cinfo.output_components;
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  *out = buffer;
  return 0;
}

/* Decodes to raw component planes (no upsampling or colour conversion).
 * Planes are written back to back, each cropped to
 * ceil(image_size * sampling / max_sampling). */
int refdec_decode_planes(const unsigned char *data, unsigned long len,
                         int float_idct, unsigned char **out, int *components,
                         int *plane_widths, int *plane_heights, char *msg,
                         int msg_len) {
  struct jpeg_decompress_struct cinfo;
  struct err_mgr err;
  unsigned char *volatile buffer = NULL;
  JSAMPARRAY volatile rows[MAX_COMPONENTS];
  memset((void *)rows, 0, sizeof(rows));

  cinfo.err = jpeg_std_error(&err.pub);
  err.pub.error_exit = on_error;
  err.pub.output_message = on_message;
  if (setjmp(err.jump)) {
    snprintf(msg, msg_len, "%s", err.message);
    for (int c = 0; c < MAX_COMPONENTS; c++) {
      if (rows[c]) {
        for (int r = 0; r < cinfo.max_v_samp_factor * DCTSIZE; r++) free(rows[c][r]);
        free(rows[c]);
      }
    }
    jpeg_destroy_decompress(&cinfo);
    free(buffer);
    return 1;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, data, len);
  jpeg_read_header(&cinfo, TRUE);
  cinfo.raw_data_out = TRUE;
  cinfo.do_block_smoothing = FALSE;
  cinfo.dct_method = float_idct ? JDCT_FLOAT : JDCT_ISLOW;
  jpeg_start_decompress(&cinfo);

  int nc = cinfo.num_components;
  int hmax = cinfo.max_h_samp_factor, vmax = cinfo.max_v_samp_factor;
  size_t total = 0;
  size_t offsets[MAX_COMPONENTS];
  for (int c = 0; c < nc; c++) {
    jpeg_component_info *ci = &cinfo.comp_info[c];
    int h = nc == 1 ? 1 : ci->h_samp_factor;
    int v = nc == 1 ? 1 : ci->v_samp_factor;
    int hm = nc == 1 ? 1 : hmax, vm = nc == 1 ? 1 : vmax;
    plane_widths[c] = (cinfo.image_width * h + hm - 1) / hm;
    plane_heights[c] = (cinfo.image_height * v + vm - 1) / vm;
    offsets[c] = total;
    total += (size_t)plane_widths[c] * plane_heights[c];
  }
  buffer = malloc(total);

  int rows_per_pass = vmax * DCTSIZE;
  JSAMPARRAY planes[MAX_COMPONENTS];
  for (int c = 0; c < nc; c++) {
    jpeg_component_info *ci = &cinfo.comp_info[c];
    size_t padded_w = (size_t)ci->width_in_blocks * DCTSIZE + 64;
    rows[c] = malloc(sizeof(JSAMPROW) * rows_per_pass);
    for (int r = 0; r < rows_per_pass; r++) rows[c][r] = malloc(padded_w);
    planes[c] = rows[c];
  }

  int y_luma = 0;
  while (cinfo.output_scanline < cinfo.output_height) {
    jpeg_read_raw_data(&cinfo, planes, rows_per_pass);
    for (int c = 0; c < nc; c++) {
      jpeg_component_info *ci = &cinfo.comp_info[c];
      int crow = ci->v_samp_factor * DCTSIZE;
      int y0 = y_luma / (vmax * DCTSIZE) * crow;
      for (int r = 0; r < crow; r++) {
        int y = y0 + r;
        if (y >= plane_heights[c]) break;
        memcpy(buffer + offsets[c] + (size_t)y * plane_widths[c], rows[c][r],
               plane_widths[c]);
      }
    }
    y_luma += rows_per_pass;
  }
  *components = nc;
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  for (int c = 0; c < nc; c++) {
    for (int r = 0; r < rows_per_pass; r++) free(rows[c][r]);
    free(rows[c]);
    rows[c] = NULL;
  }
  *out = buffer;
  return 0;
}

void refdec_free(unsigned char *p) { free(p); }
