fn main() {
    std::process::exit(numsg::cli::run(std::env::args_os()));
}
