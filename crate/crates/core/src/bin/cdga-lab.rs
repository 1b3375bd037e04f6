fn main() {
    std::process::exit(cdga_lab::cli::run(std::env::args_os()));
}
