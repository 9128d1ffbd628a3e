"""Writes the 16x16 two-class toy face set (5 open, 5 closed) used by the tests."""
import pathlib

import numpy as np

W = H = 16
root = pathlib.Path(__file__).parent / "faces"
rng = np.random.default_rng(20240607)

yy, xx = np.mgrid[0:H, 0:W]
face = 90 + 60 * np.exp(-(((xx - 7.5) / 6.0) ** 2 + ((yy - 8.0) / 7.0) ** 2))


def eyes(open_eyes, shift):
    img = face.copy()
    for cx in (4.5 + shift, 10.5 + shift):
        if open_eyes:
            img -= 70 * np.exp(-(((xx - cx) / 1.4) ** 2 + ((yy - 6.0) / 1.2) ** 2))
        else:
            img -= 55 * np.exp(-(((xx - cx) / 1.8) ** 2 + ((yy - 6.5) / 0.45) ** 2))
    return img


def write(path, img, plain):
    px = np.clip(np.rint(img), 0, 255).astype(np.uint8)
    path.parent.mkdir(parents=True, exist_ok=True)
    if plain:
        rows = "\n".join(" ".join(str(v) for v in r) for r in px)
        path.write_text(f"P2\n# toy face\n{W} {H}\n255\n{rows}\n")
    else:
        path.write_bytes(f"P5\n{W} {H}\n255\n".encode() + px.tobytes())


for label, open_eyes in (("closed", False), ("open", True)):
    for i in range(5):
        shift = rng.uniform(-0.6, 0.6)
        img = eyes(open_eyes, shift) * rng.uniform(0.9, 1.1) + rng.normal(0, 4, (H, W))
        write(root / label / f"{label}_{i}.pgm", img, plain=(i % 2 == 0))
    probe = eyes(open_eyes, 0.2) + rng.normal(0, 4, (H, W))
    write(root.parent / f"probe_{label}.pgm", probe, plain=False)
