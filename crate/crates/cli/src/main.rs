fn main() {
    std::process::exit(gaussmap_cli::cli_main(std::env::args_os()));
}
