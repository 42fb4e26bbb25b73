fn main() {
    std::process::exit(cat0_collapse::cli::cli_dispatch(std::env::args().skip(1)));
}
