fn main() {
    std::process::exit(rdpg_ase::cli::main_with_args(std::env::args_os()));
}
