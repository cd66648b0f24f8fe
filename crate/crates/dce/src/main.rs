fn main() {
    env_logger::init();
    std::process::exit(dce::cli::run());
}
