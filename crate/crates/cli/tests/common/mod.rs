#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_colanet"))
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn colanet")
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_idx_images(path: &Path, images: &[[u8; 784]]) {
    let mut b = vec![0, 0, 8, 3];
    for d in [images.len() as u32, 28, 28] {
        b.extend_from_slice(&d.to_be_bytes());
    }
    images.iter().for_each(|im| b.extend_from_slice(im));
    std::fs::write(path, b).unwrap();
}

fn write_idx_labels(path: &Path, labels: &[u8]) {
    let mut b = vec![0, 0, 8, 1];
    b.extend_from_slice(&(labels.len() as u32).to_be_bytes());
    b.extend_from_slice(labels);
    std::fs::write(path, b).unwrap();
}

/// A blocky class-dependent glyph with a little pseudo-random speckle.
fn glyph(class: usize, salt: usize) -> [u8; 784] {
    let mut im = [0u8; 784];
    let mut s = (class * 7919 + salt * 104_729 + 1) as u64;
    for r in 0..28 {
        for c in 0..28 {
            let on = (r / 7 + c / 7 + class).is_multiple_of(4) || (r + class * 2).is_multiple_of(10);
            s = s
                .wrapping_mul(6_364_136_223_846_793_005)
                .wrapping_add(1_442_695_040_888_963_407);
            let speckle = (s >> 59) == 0;
            if on ^ speckle {
                im[r * 28 + c] = 255;
            }
        }
    }
    im
}

fn split(labels: &[u8], n: usize, offset: usize) -> (Vec<[u8; 784]>, Vec<u8>) {
    let ls: Vec<u8> = (0..n).map(|i| labels[i % labels.len()]).collect();
    let ims = ls
        .iter()
        .enumerate()
        .map(|(i, &l)| glyph(l as usize % 10, i + offset))
        .collect();
    (ims, ls)
}

/// MNIST-named files with `train`/`test` samples of ten synthetic classes.
pub fn write_mnist(dir: &Path, train: usize, test: usize) {
    let digits: Vec<u8> = (0..10).collect();
    let (im, l) = split(&digits, train, 0);
    write_idx_images(&dir.join("train-images-idx3-ubyte"), &im);
    write_idx_labels(&dir.join("train-labels-idx1-ubyte"), &l);
    let (im, l) = split(&digits, test, 50_000);
    write_idx_images(&dir.join("t10k-images-idx3-ubyte"), &im);
    write_idx_labels(&dir.join("t10k-labels-idx1-ubyte"), &l);
}

/// EMNIST Balanced files holding the ten letter classes of the two-task
/// protocol plus one unused class.
pub fn write_emnist(dir: &Path, train: usize, test: usize) {
    let letters: Vec<u8> = vec![10, 11, 13, 14, 16, 17, 23, 26, 27, 28, 40];
    let (im, l) = split(&letters, train, 7);
    write_idx_images(&dir.join("emnist-balanced-train-images-idx3-ubyte"), &im);
    write_idx_labels(&dir.join("emnist-balanced-train-labels-idx1-ubyte"), &l);
    let (im, l) = split(&letters, test, 70_000);
    write_idx_images(&dir.join("emnist-balanced-test-images-idx3-ubyte"), &im);
    write_idx_labels(&dir.join("emnist-balanced-test-labels-idx1-ubyte"), &l);
}

pub fn data_dir() -> tempfile::TempDir {
    let d = tempfile::tempdir().unwrap();
    write_mnist(d.path(), 300, 100);
    write_emnist(d.path(), 330, 110);
    d
}

pub fn profile_rows(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(String::from)
        .collect()
}
