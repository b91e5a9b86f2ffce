fn main() {
    std::process::exit(ergodom::cli::run(std::env::args_os()));
}
