fn main() {
    std::process::exit(skewscope::cli::run());
}
