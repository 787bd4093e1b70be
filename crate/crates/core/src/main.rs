fn main() {
    std::process::exit(toda_quant::cli::run(std::env::args()));
}
