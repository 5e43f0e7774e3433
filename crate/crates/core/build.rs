use std::env;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

// Embed the catalog data directory so the binary works from anywhere;
// the on-disk files stay authoritative for round-trip tests.
fn main() {
    let manifest = env::var("CARGO_MANIFEST_DIR").unwrap();
    let data = Path::new(&manifest).join("data").join("catalog");
    println!("cargo:rerun-if-changed={}", data.display());
    let mut names: Vec<String> = fs::read_dir(&data)
        .expect("data/catalog directory")
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    let mut out = String::from(
        "/// (file name, contents) pairs for every shipped catalog file.\n\
         pub static CATALOG_FILES: &[(&str, &str)] = &[\n",
    );
    for name in names {
        writeln!(
            out,
            "    ({name:?}, include_str!(concat!(env!(\"CARGO_MANIFEST_DIR\"), \"/data/catalog/{name}\"))),",
        )
        .unwrap();
    }
    out.push_str("];\n");
    let dest = Path::new(&env::var("OUT_DIR").unwrap()).join("catalog_data.rs");
    fs::write(dest, out).unwrap();
}
