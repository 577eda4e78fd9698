fn main() {
    println!("cargo:rerun-if-changed=csrc/refdec.c");
    cc::Build::new().file("csrc/refdec.c").warnings(true).compile("refdec");
    println!("cargo:rustc-link-lib=jpeg");
}
