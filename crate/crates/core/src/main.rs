fn main() {
    std::process::exit(gridbend::cli::run(std::env::args_os()));
}
