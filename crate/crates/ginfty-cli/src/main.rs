fn main() {
    println!("ginfty");
}
