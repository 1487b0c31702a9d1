fn main() {
    std::process::exit(perturba::harness::run(std::env::args_os()));
}
