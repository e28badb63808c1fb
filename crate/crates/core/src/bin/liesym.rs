fn main() {
    std::process::exit(liesym::cli::main_with(std::env::args_os()));
}
