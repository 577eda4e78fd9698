use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use syncjpeg::oracle::{oracle_encode, synthetic_image};
use syncjpeg::ChromaSampling;
use syncjpeg_refdec::{decode_pixels, decode_planes, IdctMethod};

fn syncjpeg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_syncjpeg"))
        .args(args)
        .output()
        .expect("spawn syncjpeg")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn realworld(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/data/realworld")
        .join(name)
}

fn write_synthetic(dir: &Path, name: &str, w: usize, h: usize, sampling: ChromaSampling) -> PathBuf {
    let channels = if sampling == ChromaSampling::Grayscale { 1 } else { 3 };
    let img = synthetic_image(w, h, channels, 7);
    let path = dir.join(name);
    std::fs::write(&path, oracle_encode(&img, 75, sampling).bytes).unwrap();
    path
}

/// Splits a binary netpbm file into (width, height, payload).
fn netpbm(bytes: &[u8]) -> (usize, usize, &[u8]) {
    let mut fields = Vec::new();
    let mut pos = 0;
    while fields.len() < 4 {
        let start = pos;
        while !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        fields.push(std::str::from_utf8(&bytes[start..pos]).unwrap().to_string());
        pos += 1;
    }
    assert!(fields[0] == "P5" || fields[0] == "P6");
    assert_eq!(fields[3], "255");
    (fields[1].parse().unwrap(), fields[2].parse().unwrap(), &bytes[pos..])
}

fn max_abs_diff(a: &[u8], b: &[u8]) -> u8 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.abs_diff(*y)).max().unwrap_or(0)
}

fn field<'a>(report: &'a str, label: &str) -> &'a str {
    report
        .lines()
        .find_map(|l| l.strip_prefix(label))
        .unwrap_or_else(|| panic!("no {label:?} line in:\n{report}"))
        .trim()
}

#[test]
fn decode_matches_libjpeg() {
    let dir = tempfile::tempdir().unwrap();
    let input = realworld("coffee_q75_420.jpg");
    let file = std::fs::read(&input).unwrap();

    let ppm = dir.path().join("out.ppm");
    let out = syncjpeg(&["decode", input.to_str().unwrap(), ppm.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let bytes = std::fs::read(&ppm).unwrap();
    let (w, h, rgb) = netpbm(&bytes);
    let reference = decode_pixels(&file, true, IdctMethod::Float).unwrap();
    assert_eq!((w, h), (reference.width, reference.height));
    assert!(max_abs_diff(rgb, &reference.data) <= 2);

    let planes = dir.path().join("p.pgm");
    let out = syncjpeg(&[
        "decode",
        input.to_str().unwrap(),
        planes.to_str().unwrap(),
        "--colorspace",
        "planes",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let reference = decode_planes(&file, IdctMethod::IntegerSlow).unwrap();
    for (name, r) in ["y", "cb", "cr"].iter().zip(&reference) {
        let bytes = std::fs::read(dir.path().join(format!("p.{name}.pgm"))).unwrap();
        let (w, h, data) = netpbm(&bytes);
        assert_eq!((w, h), (r.width, r.height), "plane {name}");
        assert!(max_abs_diff(data, &r.data) <= 1, "plane {name}");
    }
}

#[test]
fn grayscale_decodes_to_pgm() {
    let dir = tempfile::tempdir().unwrap();
    let input = realworld("camera_q85_gray.jpg");
    let pgm = dir.path().join("g.pgm");
    let out = syncjpeg(&[
        "decode",
        input.to_str().unwrap(),
        pgm.to_str().unwrap(),
        "--colorspace",
        "gray",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let bytes = std::fs::read(&pgm).unwrap();
    assert!(bytes.starts_with(b"P5\n"));
    let reference = decode_pixels(&std::fs::read(&input).unwrap(), false, IdctMethod::IntegerSlow).unwrap();
    assert!(max_abs_diff(netpbm(&bytes).2, &reference.data) <= 1);
}

#[test]
fn partition_size_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = realworld("astronaut_q90_422.jpg");
    let a = dir.path().join("a.ppm");
    let b = dir.path().join("b.ppm");
    let input = input.to_str().unwrap();
    assert!(syncjpeg(&["decode", input, a.to_str().unwrap()]).status.success());
    assert!(syncjpeg(&[
        "decode",
        input,
        b.to_str().unwrap(),
        "--subseq-bits",
        "128",
        "--seq-len",
        "3",
        "--workers",
        "2",
    ])
    .status
    .success());
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn progressive_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_synthetic(dir.path(), "p.jpg", 32, 32, ChromaSampling::S420);
    let mut bytes = std::fs::read(&path).unwrap();
    let sof = bytes.windows(2).position(|w| w == [0xFF, 0xC0]).unwrap();
    bytes[sof + 1] = 0xC2;
    std::fs::write(&path, bytes).unwrap();

    let out = syncjpeg(&["decode", path.to_str().unwrap(), dir.path().join("o.ppm").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(10));
    let err = stderr(&out);
    assert!(err.contains("UnsupportedFeature"), "{err}");
    assert!(err.contains("SOF2"), "{err}");
}

#[test]
fn missing_input_and_bad_config() {
    let out = syncjpeg(&["decode", "/nonexistent/x.jpg", "/tmp/x.ppm"]);
    assert_eq!(out.status.code(), Some(3));

    let input = realworld("china.jpg");
    let out = syncjpeg(&["inspect", input.to_str().unwrap(), "--subseq-bits", "100"]);
    assert_ne!(out.status.code(), Some(0));
    assert!(stderr(&out).starts_with("error:"));
}

#[test]
fn inspect_reports_layout() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_synthetic(dir.path(), "c.jpg", 48, 48, ChromaSampling::S420);
    let out = syncjpeg(&["inspect", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report = stdout(&out);
    assert_eq!(field(&report, "components:"), "3");
    assert!(field(&report, "mcus:").starts_with("9 "));
    assert_eq!(field(&report, "data units/mcu:"), "6");
    assert_eq!(field(&report, "data units:"), "54");

    let path = write_synthetic(dir.path(), "g.jpg", 40, 24, ChromaSampling::Grayscale);
    let out = syncjpeg(&["inspect", path.to_str().unwrap(), "--subseq-bits", "64", "--seq-len", "4"]);
    let report = stdout(&out);
    assert_eq!(field(&report, "components:"), "1");
    assert_eq!(field(&report, "data units/mcu:"), "1");
    let bits: usize = field(&report, "scan bits:").parse().unwrap();
    let n: usize = field(&report, "subsequences (N):").parse().unwrap();
    let b: usize = field(&report, "sequences (B):").parse().unwrap();
    assert_eq!(n, bits.div_ceil(64));
    assert_eq!(b, n.div_ceil(4));
}

#[test]
fn bench_sweep_is_consistent() {
    let dir = tempfile::tempdir().unwrap();
    for (i, s) in [ChromaSampling::S420, ChromaSampling::S444, ChromaSampling::Grayscale]
        .into_iter()
        .enumerate()
    {
        write_synthetic(dir.path(), &format!("{i}.jpg"), 64, 40, s);
    }
    let out = syncjpeg(&[
        "bench",
        dir.path().to_str().unwrap(),
        "--subseq-bits",
        "64,256,1024",
        "--warmup",
        "0",
        "--iterations",
        "2",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    let checksum = &rows[0]["checksum"];
    for (row, bits) in rows.iter().zip([64, 256, 1024]) {
        assert_eq!(&row["checksum"], checksum);
        assert_eq!(row["config"]["subseq_bits"], bits);
        assert_eq!(row["files"], 3);
        assert_eq!(row["errors"], 0);
        assert_eq!(row["iterations"], 2);
        assert!(row["wall_ms"].as_f64().unwrap() > 0.0);
        assert!(row["stages"]["idct"].as_f64().is_some());
    }

    let out = syncjpeg(&["bench", dir.path().to_str().unwrap(), "--format", "csv", "--seq-len", "2,8"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = stdout(&out);
    let lines: Vec<_> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("batch,subseq_bits,b,workers"));
}

#[test]
fn bench_rejects_empty_corpus() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("notes.txt"), "x").unwrap();
    std::fs::write(dir.path().join("junk.jpg"), [0u8; 16]).unwrap();
    let out = syncjpeg(&["bench", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("no decodable JPEG files"));
}

#[test]
fn gen_corpus_writes_decodable_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = syncjpeg(&["gen-corpus", dir.path().to_str().unwrap(), "--count", "5"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let uni = dir.path().join("uniform");
    let out = syncjpeg(&[
        "gen-corpus",
        uni.to_str().unwrap(),
        "--count",
        "3",
        "--uniform",
        "24x16",
        "--sampling",
        "422",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));

    for d in [dir.path(), uni.as_path()] {
        let files: Vec<_> = std::fs::read_dir(d)
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.extension().is_some_and(|e| e == "jpg"))
            .collect();
        assert_eq!(files.len(), if d == uni { 3 } else { 5 });
        for f in files {
            let bytes = std::fs::read(&f).unwrap();
            assert!(decode_pixels(&bytes, true, IdctMethod::IntegerSlow).is_ok(), "{f:?}");
        }
    }

    let out = syncjpeg(&["gen-corpus", dir.path().to_str().unwrap(), "--uniform", "24by16"]);
    assert_eq!(out.status.code(), Some(2));
}
