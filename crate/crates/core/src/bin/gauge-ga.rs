fn main() { std::process::exit(gauge_ga::cli::main()) }
