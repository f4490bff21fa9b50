fn main() {
    std::process::exit(kfib_core::cli::dispatch(std::env::args_os()));
}
