fn main() {
    std::process::exit(shift_lock::cli::run(std::env::args_os()));
}
