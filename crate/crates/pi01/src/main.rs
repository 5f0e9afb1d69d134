fn main() {
    std::process::exit(pi01::cli::run(std::env::args_os()));
}
