use std::process::exit;

fn main() {
    exit(hilbert_mu::cli::run(std::env::args_os()));
}
