fn main() {
    std::process::exit(avoidant_approx::cli::main_with_args(std::env::args_os()));
}
