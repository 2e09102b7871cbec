fn main() {
    std::process::exit(elliptic_sync::cli::run(std::env::args_os()));
}
