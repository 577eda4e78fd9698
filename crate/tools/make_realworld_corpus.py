"""Collect the third-party baseline JPEG corpus used by the conformance tests.

Copies the photographic JPEG samples shipped with matplotlib, scikit-image and
scikit-learn, and re-encodes a few natural photographs with libjpeg-turbo (via
Pillow) to cover 4:2:2, grayscale, optimized Huffman tables and odd sizes.
"""
import os
import shutil
import sys

import numpy as np
import skimage.data
from PIL import Image

import matplotlib
import sklearn

OUT = sys.argv[1] if len(sys.argv) > 1 else "crates/core/tests/data/realworld"
os.makedirs(OUT, exist_ok=True)

copies = [
    os.path.join(os.path.dirname(matplotlib.__file__), "mpl-data/sample_data/grace_hopper.jpg"),
    os.path.join(os.path.dirname(skimage.data.__file__), "hubble_deep_field.jpg"),
    os.path.join(os.path.dirname(skimage.data.__file__), "retina.jpg"),
    os.path.join(os.path.dirname(skimage.data.__file__), "rocket.jpg"),
    os.path.join(os.path.dirname(sklearn.__file__), "datasets/images/flower.jpg"),
    os.path.join(os.path.dirname(sklearn.__file__), "datasets/images/china.jpg"),
]
for path in copies:
    shutil.copy(path, os.path.join(OUT, os.path.basename(path)))


def save(arr, name, **kw):
    Image.fromarray(np.ascontiguousarray(arr)).save(os.path.join(OUT, name), "JPEG", **kw)


save(skimage.data.astronaut(), "astronaut_q90_422.jpg", quality=90, subsampling=1)
save(skimage.data.coffee(), "coffee_q75_420.jpg", quality=75, subsampling=2)
save(skimage.data.camera(), "camera_q85_gray.jpg", quality=85)
save(skimage.data.chelsea()[:300, :451], "chelsea_q40_444.jpg", quality=40, subsampling=0)
save(skimage.data.coins(), "coins_q60_gray_opt.jpg", quality=60, optimize=True)
save(skimage.data.astronaut()[100:117, 200:233], "astronaut_crop_q95_420.jpg", quality=95, subsampling=2)
save(skimage.data.coffee()[:, :397], "coffee_q20_420_opt.jpg", quality=20, subsampling=2, optimize=True)
