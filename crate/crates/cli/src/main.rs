fn main() {
    std::process::exit(typechange_cli::run(std::env::args_os()));
}
