fn main() {
    std::process::exit(olymp::main_with(std::env::args_os()));
}
