use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = env::var("CARGO_MANIFEST_DIR").unwrap();
    let out = PathBuf::from(&crate_dir).join("include").join("minfb.h");

    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_language(cbindgen::Language::C)
        .with_include_guard("MINFB_H")
        .with_cpp_compat(true)
        .generate()
        .expect("cbindgen failed to generate the C header")
        .write_to_file(out);

    println!("cargo:rerun-if-changed=src/lib.rs");
}
