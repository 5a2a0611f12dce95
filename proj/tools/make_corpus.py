"""Regenerates the PGM test corpus in tests/data from scikit-image sample data."""
import pathlib

import numpy as np
import skimage.data
import skimage.transform

OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "data"


def resize(img, shape):
    out = skimage.transform.resize(img.astype(float), shape, anti_aliasing=True, preserve_range=True)
    return np.clip(np.rint(out), 0, 255).astype(np.uint16)


def write_p5(path, img, maxval=255):
    rows, cols = img.shape
    header = f"P5\n# {path.name}\n{cols} {rows}\n{maxval}\n".encode()
    dtype = ">u2" if maxval > 255 else "u1"
    path.write_bytes(header + img.astype(dtype).tobytes())


def write_p2(path, img, maxval=255):
    rows, cols = img.shape
    lines = [f"P2\n# {path.name}\n{cols} {rows}\n{maxval}"]
    for row in img:
        lines.append(" ".join(str(int(v)) for v in row))
    path.write_text("\n".join(lines) + "\n")


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    write_p5(OUT / "camera64.pgm", resize(skimage.data.camera(), (64, 64)))
    write_p2(OUT / "coins64.pgm", resize(skimage.data.coins(), (64, 64)))
    write_p5(OUT / "moon48x80.pgm", resize(skimage.data.moon()[100:340, 50:450], (48, 80)))

    y, x = np.mgrid[0:64, 0:64]
    checker = np.where(((y // 8) + (x // 8)) % 2 == 0, 40, 215)
    write_p5(OUT / "checker64.pgm", checker)
    ramp = np.rint(255.0 * (x + y) / 126.0)
    write_p5(OUT / "ramp64.pgm", ramp)
    radius = np.hypot(y - 31.5, x - 31.5)
    disk = np.rint(65535.0 / (1.0 + np.exp((radius - 20.0) / 1.5)))
    write_p5(OUT / "disk64_16bit.pgm", disk, maxval=65535)


if __name__ == "__main__":
    main()
