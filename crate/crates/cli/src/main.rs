fn main() {
    std::process::exit(hc_rankone_cli::run(std::env::args_os()));
}
