fn main() {
    std::process::exit(boundkde_cli::run(std::env::args_os()));
}
