fn main() {
    std::process::exit(qkernel::cli::run(std::env::args_os()));
}
