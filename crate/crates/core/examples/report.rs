use trirep::catalog;

fn main() {
    let entries = catalog::builtin().expect("catalog");
    let report = catalog::verify_all(&entries, 2, 7, 4);
    println!("{}", report.render());
}
