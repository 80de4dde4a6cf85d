#!/usr/bin/env python3
"""Export seeded-random ONNX backbones for exercising the real-extractor path.

Writes, into the output directory:
  frame_net.onnx / frame_net.json   2D backbone, five feature outputs + pooled embedding
  clip_net.onnx  / clip_net.json    3D backbone, five feature outputs + pooled embedding
  reference_frame.png               deterministic test image
  reference_outputs.json            torch activations for the reference inputs
"""
import argparse
import hashlib
import json
import os

import numpy as np
import torch
import torch.nn as nn

FRAME_SIZE = (96, 96)  # (height, width)
CLIP_SIZE = (48, 48)
CLIP_LENGTH = 10


class FrameNet(nn.Module):
    def __init__(self):
        super().__init__()
        self.c1 = nn.Conv2d(3, 16, 5, stride=2, padding=2)
        self.c2 = nn.Conv2d(16, 24, 3, padding=1)
        self.c3 = nn.Conv2d(24, 32, 3, padding=1)
        self.c4 = nn.Conv2d(32, 32, 3, padding=1)
        self.c5 = nn.Conv2d(32, 24, 3, padding=1)
        self.head = nn.Conv2d(24, 32, 1)
        self.pool = nn.MaxPool2d(2)

    def forward(self, x):
        l1 = torch.relu(self.c1(x))
        l2 = torch.relu(self.c2(self.pool(l1)))
        l3 = torch.relu(self.c3(self.pool(l2)))
        l4 = torch.relu(self.c4(l3))
        l5 = torch.relu(self.c5(l4))
        emb = torch.tanh(self.head(l5))
        return l1, l2, l3, l4, l5, emb


class ClipNet(nn.Module):
    def __init__(self):
        super().__init__()
        self.c1 = nn.Conv3d(3, 8, (3, 5, 5), stride=(1, 2, 2), padding=(1, 2, 2))
        self.c2 = nn.Conv3d(8, 12, 3, padding=1)
        self.c3 = nn.Conv3d(12, 16, 3, padding=1)
        self.c4 = nn.Conv3d(16, 16, 3, padding=1)
        self.c5 = nn.Conv3d(16, 16, 3, padding=1)
        self.head = nn.Conv3d(16, 24, 1)
        self.pool = nn.MaxPool3d((1, 2, 2))

    def forward(self, x):
        l1 = torch.relu(self.c1(x))
        l2 = torch.relu(self.c2(self.pool(l1)))
        l3 = torch.relu(self.c3(self.pool(l2)))
        l4 = torch.relu(self.c4(l3))
        l5 = torch.relu(self.c5(l4))
        emb = torch.tanh(self.head(l5))
        return l1, l2, l3, l4, l5, emb


OUTPUTS = ["l1", "l2", "l3", "l4", "l5", "pool"]


def sha256_file(path):
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def reference_image(height, width):
    y, x = np.mgrid[0:height, 0:width]
    r = (x * 255 // max(1, width - 1)).astype(np.uint8)
    g = (y * 255 // max(1, height - 1)).astype(np.uint8)
    b = (((x // 8) + (y // 8)) % 2 * 200 + 28).astype(np.uint8)
    return np.stack([r, g, b], axis=-1)


def preprocess(rgb, mean, std):
    x = rgb.astype(np.float32) / 255.0
    x = (x - np.array(mean, np.float32)) / np.array(std, np.float32)
    return x.transpose(2, 0, 1)


def export(model, dummy, path, dynamic_axes):
    torch.onnx.export(model, dummy, path, input_names=["input"], output_names=OUTPUTS,
                      opset_version=11, dynamo=False, dynamic_axes=dynamic_axes)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("out")
    ap.add_argument("--seed", type=int, default=20240601)
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    torch.manual_seed(args.seed)
    rng = np.random.default_rng(args.seed)
    mean, std = [0.5, 0.5, 0.5], [0.5, 0.5, 0.5]

    frame_net = FrameNet().eval()
    clip_net = ClipNet().eval()
    fh, fw = FRAME_SIZE
    ch, cw = CLIP_SIZE
    frame_path = os.path.join(args.out, "frame_net.onnx")
    clip_path = os.path.join(args.out, "clip_net.onnx")
    export(frame_net, torch.zeros(1, 3, fh, fw), frame_path, {"input": {0: "batch"}})
    export(clip_net, torch.zeros(1, 3, CLIP_LENGTH, ch, cw), clip_path, {"input": {2: "time"}})

    frame_channels = [16, 24, 32, 32, 24]
    weights = [rng.uniform(0.1, 1.0, c).round(6).tolist() for c in frame_channels]
    stanza = {"size": {"width": fw, "height": fh}, "mean": mean, "std": std}
    frame_cfg = {
        "name": "test-frame-net", "kind": "frame", "model": "frame_net.onnx",
        "fingerprint": sha256_file(frame_path), "input": "input",
        "feature_outputs": OUTPUTS[:5], "embedding_output": "pool",
        "layer_weights": weights, "preprocessing": stanza, "batch_size": 8,
    }
    clip_cfg = {
        "name": "test-clip-net", "kind": "clip", "model": "clip_net.onnx",
        "fingerprint": sha256_file(clip_path), "input": "input",
        "feature_outputs": OUTPUTS[:5], "embedding_output": "pool",
        "clip_length": CLIP_LENGTH,
        "preprocessing": {"size": {"width": cw, "height": ch}, "mean": mean, "std": std},
    }
    for name, cfg in (("frame_net.json", frame_cfg), ("clip_net.json", clip_cfg)):
        with open(os.path.join(args.out, name), "w") as f:
            json.dump(cfg, f, indent=2)

    # Reference inputs are generated at model resolution so no resize enters the comparison.
    import cv2
    img = reference_image(fh, fw)
    cv2.imwrite(os.path.join(args.out, "reference_frame.png"), img[:, :, ::-1])
    clip_img = reference_image(ch, cw)
    clip_frames = [np.roll(clip_img, 2 * t, axis=1) for t in range(CLIP_LENGTH + 4)]
    clip_dir = os.path.join(args.out, "reference_clip")
    os.makedirs(clip_dir, exist_ok=True)
    for t, fr in enumerate(clip_frames):
        cv2.imwrite(os.path.join(clip_dir, "%05d.png" % t), fr[:, :, ::-1])

    def summarize(tensors):
        out = {}
        for name, t in zip(OUTPUTS, tensors):
            a = t.detach().numpy().astype(np.float64)
            out[name] = {"shape": list(a.shape), "sum": float(a.sum()), "abs_sum": float(np.abs(a).sum()),
                         "head": a.reshape(-1)[:16].tolist()}
        return out

    with torch.no_grad():
        fx = torch.from_numpy(preprocess(img, mean, std))[None]
        frame_ref = summarize(frame_net(fx))
        cx = np.stack([preprocess(f, mean, std) for f in clip_frames[:CLIP_LENGTH]], axis=1)
        clip_ref = summarize(clip_net(torch.from_numpy(cx)[None]))
        vx = np.stack([preprocess(f, mean, std) for f in clip_frames], axis=1)
        video_ref = summarize(clip_net(torch.from_numpy(vx)[None]))
    with open(os.path.join(args.out, "reference_outputs.json"), "w") as f:
        json.dump({"frame": frame_ref, "clip": clip_ref, "video": video_ref}, f, indent=1)


if __name__ == "__main__":
    main()
