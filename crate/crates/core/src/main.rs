fn main() {
    elimtemplates::cli::main()
}
