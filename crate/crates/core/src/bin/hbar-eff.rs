fn main() {
    std::process::exit(hbar_eff::cli::run(std::env::args_os()));
}
