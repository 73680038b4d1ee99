fn main() {
    std::process::exit(frenet_bv::cli::run(std::env::args_os()));
}
