fn main() {
    std::process::exit(critbind_cli::run(std::env::args_os()));
}
