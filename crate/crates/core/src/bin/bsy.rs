fn main() {
    std::process::exit(bsy::cli::run());
}
