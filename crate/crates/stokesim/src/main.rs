fn main() {
    // CLI wired up after the library modules land.
}
