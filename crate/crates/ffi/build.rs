use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());

    let config = cbindgen::Config {
        usize_is_size_t: true,
        enumeration: cbindgen::EnumConfig {
            prefix_with_name: true,
            rename_variants: cbindgen::RenameRule::ScreamingSnakeCase,
            ..Default::default()
        },
        ..Default::default()
    };

    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .with_language(cbindgen::Language::C)
        .with_cpp_compat(true)
        .with_include_guard("MAINTCOST_H")
        .with_sys_include("stdint.h")
        .with_sys_include("stddef.h")
        .with_no_includes()
        .generate()
        .expect("unable to generate bindings")
        .write_to_file(crate_dir.join("include/maintcost.h"));

    println!("cargo:rerun-if-changed=src/");
}
