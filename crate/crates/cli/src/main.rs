fn main() {
    std::process::exit(holodyn_cli::run(std::env::args_os()));
}
