use std::process::exit;

fn main() {
    exit(treeshift::cli::run(std::env::args_os()));
}
