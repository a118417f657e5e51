fn main() {
    let code = hybrid_ordinal::cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
