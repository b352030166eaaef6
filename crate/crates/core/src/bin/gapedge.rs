fn main() {
    std::process::exit(gapedge::cli::main_with_args(std::env::args_os()));
}
