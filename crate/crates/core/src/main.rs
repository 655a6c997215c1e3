fn main() {
    std::process::exit(flagcontact::cli::run(std::env::args_os()));
}
