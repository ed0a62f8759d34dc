fn main() {
    std::process::exit(zetafrob_cli::run(std::env::args_os()));
}
