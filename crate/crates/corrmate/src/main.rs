fn main() {
    std::process::exit(corrmate::cli::run_from_env());
}
