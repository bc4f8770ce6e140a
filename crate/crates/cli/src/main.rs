fn main() {
    let (code, _) = reccost_cli::run(std::env::args_os().skip(1));
    std::process::exit(code);
}
