fn main() {
    std::process::exit(lattice_localtime::cli::run(std::env::args_os()));
}
