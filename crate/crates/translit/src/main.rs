fn main() {
    std::process::exit(translit::cli::run(std::env::args_os()));
}
