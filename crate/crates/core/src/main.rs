fn main() {
    std::process::exit(gdmd::cli::main_with_args(std::env::args_os()));
}
