fn main() {
    std::process::exit(delsarte::cli::run(std::env::args_os()));
}
