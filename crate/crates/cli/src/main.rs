fn main() {
    std::process::exit(cipherbridge_cli::cli_main(std::env::args_os()));
}
