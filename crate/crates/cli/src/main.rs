fn main() {
    std::process::exit(kgforge_cli::run(std::env::args_os()));
}
