fn main() {
    let code = avoid_lab::cli::run(std::env::args_os());
    std::process::exit(code);
}
