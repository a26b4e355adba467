fn main() {
    let (code, out) = circlet::cli::run(std::env::args());
    print!("{out}");
    std::process::exit(code);
}
