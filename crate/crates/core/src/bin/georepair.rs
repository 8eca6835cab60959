fn main() {
    std::process::exit(georepair::cli::run(std::env::args_os()));
}
