fn main() {
    std::process::exit(greedy_riesz::cli::run(std::env::args_os()));
}
