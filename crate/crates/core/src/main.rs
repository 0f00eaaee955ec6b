fn main() {
    std::process::exit(stitchlab::cli::run(std::env::args_os()));
}
