fn main() {
    std::process::exit(corpsim::cli::run(std::env::args_os()));
}
