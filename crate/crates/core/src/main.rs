fn main() {
    std::process::exit(isostitch::cli::run(std::env::args_os()));
}
