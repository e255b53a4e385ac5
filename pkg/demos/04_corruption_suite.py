"""Apply every corruption mode to one scene and save the results side by side."""

from pathlib import Path

from ragseg import Blur, Brightness, Grayscale, Jitter, corrupt, save_image
from ragseg.synthetic import textured_blocks

out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

img = textured_blocks(size=64, blocks=4, seed=5)
save_image(img, out_dir / "corrupt_none.png")

modes = {
    "overexposed": Brightness(1.8),
    "underexposed": Brightness(0.4),
    "blurred": Blur(9, 5.0),
    "grayscale": Grayscale(),
    "jittered": Jitter(0.2, 0.3, 0.3, 0.1, seed=42),
}
for name, mode in modes.items():
    out = corrupt(img, mode)
    save_image(out, out_dir / f"corrupt_{name}.png")
    print(f"{name:13s} mean luma {out.data.mean():.3f}")
