fn main() {
    std::process::exit(graphdim::harness::main_with_args(std::env::args_os()));
}
