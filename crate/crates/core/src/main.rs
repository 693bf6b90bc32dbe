fn main() {
    std::process::exit(rf_sense::cli::run(std::env::args_os()));
}
