fn main() { std::process::exit(novikov::cli::main(std::env::args_os())) }
