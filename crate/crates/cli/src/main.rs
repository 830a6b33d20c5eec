fn main() {
    std::process::exit(kneadlab::run(std::env::args_os()));
}
