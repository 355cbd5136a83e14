fn main() {
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").expect("cargo sets CARGO_MANIFEST_DIR");
    match cbindgen::generate(&crate_dir) {
        Ok(bindings) => {
            bindings.write_to_file(format!("{crate_dir}/include/alek.h"));
        }
        // The committed header stays usable when cbindgen cannot run (e.g.
        // offline rebuilds of a vendored tree); regeneration is best-effort.
        Err(e) => println!("cargo:warning=skipping C header regeneration: {e}"),
    }
}
