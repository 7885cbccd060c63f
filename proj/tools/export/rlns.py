#!/usr/bin/env python3
"""Writers for the RLNS v1 checkpoint and vocabulary formats, plus a Llama exporter.

Usage:
  rlns.py export --model <id-or-path> --out <dir> [--pretokenize prompts.jsonl]
  rlns.py random-tiny --out <dir> [--seed N]
"""
import argparse
import hashlib
import json
import pathlib
import struct
import sys

import numpy as np

MAGIC = b"RLNS"
VERSION = 1
MARKER = "▁"
LAYER_LEAVES = ("attn_norm", "wq", "wk", "wv", "wo", "mlp_norm", "w_gate", "w_up", "w_down")
CONFIG_KEYS = ("n_layers", "dim", "n_heads", "n_kv_heads", "mlp_hidden", "vocab_size",
               "rope_theta", "norm_eps", "max_seq_len")


class MappingError(Exception):
    pass


class UnsupportedArchitecture(Exception):
    pass


def canonical_names(n_layers):
    names = ["tok_embed"]
    for i in range(n_layers):
        names += [f"layers.{i}.{leaf}" for leaf in LAYER_LEAVES]
    return names + ["final_norm", "unembed"]


def expected_dims(config, name):
    d = config["dim"]
    kv = config["n_kv_heads"] * (d // config["n_heads"])
    h = config["mlp_hidden"]
    leaf = name.rsplit(".", 1)[-1]
    table = {
        "tok_embed": (config["vocab_size"], d), "unembed": (config["vocab_size"], d),
        "final_norm": (d,), "attn_norm": (d,), "mlp_norm": (d,),
        "wq": (d, d), "wo": (d, d), "wk": (kv, d), "wv": (kv, d),
        "w_gate": (h, d), "w_up": (h, d), "w_down": (d, h),
    }
    return table[leaf]


def sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_checkpoint(path, config, tensors):
    """Write tensors (name -> array) in canonical order. Returns the file digest."""
    missing = [k for k in CONFIG_KEYS if k not in config]
    if missing:
        raise MappingError(f"config lacks {missing}")
    names = canonical_names(config["n_layers"])
    absent = [n for n in names if n not in tensors]
    if absent:
        raise MappingError(f"no source tensor for {absent}")
    extra = sorted(set(tensors) - set(names))
    if extra:
        raise MappingError(f"unmapped tensors {extra}")

    directory, payloads, offset = [], [], 0
    for name in names:
        a = np.ascontiguousarray(tensors[name], dtype="<f4")
        if a.shape != expected_dims(config, name):
            raise MappingError(f"{name} has shape {a.shape}, expected {expected_dims(config, name)}")
        directory.append({"name": name, "dims": list(a.shape), "byte_offset": offset})
        payloads.append(a.tobytes())
        offset += a.nbytes
    header = json.dumps({"config": {k: config[k] for k in CONFIG_KEYS}, "tensors": directory},
                        separators=(",", ":")).encode("utf-8")
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<IQ", VERSION, len(header)))
        f.write(header)
        for p in payloads:
            f.write(p)
    return sha256(path)


def write_vocab(path, surfaces, marker=MARKER):
    """surfaces: dict id -> text. Sparse ids are remapped densely; returns the remap."""
    ordered = sorted(surfaces.items())
    remap = {old: new for new, (old, _) in enumerate(ordered) if old != new}
    doc = {"space_marker": marker,
           "tokens": [{"id": i, "text": text} for i, (_, text) in enumerate(ordered)]}
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f, ensure_ascii=False, indent=1)
        f.write("\n")
    return remap


def llama_tensors(model):
    """Map a transformers LlamaForCausalLM onto canonical names."""
    cfg = model.config
    if getattr(cfg, "model_type", None) not in ("llama", "mistral"):
        raise UnsupportedArchitecture(f"model_type {getattr(cfg, 'model_type', None)!r}")
    if getattr(cfg, "hidden_act", "silu") != "silu":
        raise UnsupportedArchitecture(f"activation {cfg.hidden_act!r}")
    state = {k: v.detach().float().cpu().numpy() for k, v in model.state_dict().items()}
    if "lm_head.weight" not in state:
        raise MappingError("source has no unembedding (lm_head.weight)")

    mapping = {"model.embed_tokens.weight": "tok_embed", "model.norm.weight": "final_norm",
               "lm_head.weight": "unembed"}
    leaves = {"input_layernorm.weight": "attn_norm", "self_attn.q_proj.weight": "wq",
              "self_attn.k_proj.weight": "wk", "self_attn.v_proj.weight": "wv",
              "self_attn.o_proj.weight": "wo", "post_attention_layernorm.weight": "mlp_norm",
              "mlp.gate_proj.weight": "w_gate", "mlp.up_proj.weight": "w_up",
              "mlp.down_proj.weight": "w_down"}
    for i in range(cfg.num_hidden_layers):
        for src, leaf in leaves.items():
            mapping[f"model.layers.{i}.{src}"] = f"layers.{i}.{leaf}"

    unmapped = sorted(k for k in state if k not in mapping and not k.endswith("rotary_emb.inv_freq"))
    if unmapped:
        raise MappingError(f"unmapped source tensors {unmapped}")
    tensors = {mapping[k]: v for k, v in state.items() if k in mapping}
    rope_theta = getattr(cfg, "rope_theta", None)
    if rope_theta is None:
        rope_theta = (getattr(cfg, "rope_parameters", None) or {}).get("rope_theta", 10000.0)
    config = {
        "n_layers": cfg.num_hidden_layers, "dim": cfg.hidden_size,
        "n_heads": cfg.num_attention_heads,
        "n_kv_heads": getattr(cfg, "num_key_value_heads", None) or cfg.num_attention_heads,
        "mlp_hidden": cfg.intermediate_size, "vocab_size": cfg.vocab_size,
        "rope_theta": float(rope_theta), "norm_eps": float(cfg.rms_norm_eps),
        "max_seq_len": cfg.max_position_embeddings,
    }
    return config, tensors, {v: k for k, v in mapping.items()}


def tokenizer_surfaces(tokenizer):
    vocab = tokenizer.get_vocab()
    return {i: s for s, i in vocab.items()}


def export(model, tokenizer, out_dir, source_id, pretokenize=None):
    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    config, tensors, mapping = llama_tensors(model)
    ckpt = out / "model.rlns"
    write_checkpoint(ckpt, config, tensors)
    manifest = {"source": source_id, "tensor_mapping": mapping, "config": config,
                "files": {"model.rlns": sha256(ckpt)}}
    if tokenizer is not None:
        vocab = out / "vocab.json"
        remap = write_vocab(vocab, tokenizer_surfaces(tokenizer))
        manifest["files"]["vocab.json"] = sha256(vocab)
        manifest["id_remap"] = {str(k): v for k, v in remap.items()}
        if pretokenize:
            pre = out / "pretokenized.jsonl"
            with open(pretokenize, encoding="utf-8") as src, open(pre, "w", encoding="utf-8") as dst:
                for line in src:
                    if not line.strip():
                        continue
                    rec = json.loads(line)
                    ids = tokenizer.encode(rec["text"], add_special_tokens=False)
                    dst.write(json.dumps({**rec, "token_ids": [remap.get(i, i) for i in ids]},
                                         ensure_ascii=False) + "\n")
            manifest["files"]["pretokenized.jsonl"] = sha256(pre)
    with open(out / "export_manifest.json", "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=1)
    return manifest


def random_tiny(out_dir, seed):
    """Random Llama model exported alongside its own final logits on a fixed prompt."""
    import torch
    from transformers import LlamaConfig, LlamaForCausalLM

    torch.manual_seed(seed)
    cfg = LlamaConfig(vocab_size=48, hidden_size=32, intermediate_size=80, num_hidden_layers=3,
                      num_attention_heads=4, num_key_value_heads=2, max_position_embeddings=64,
                      rms_norm_eps=1e-5, rope_theta=10000.0, tie_word_embeddings=False,
                      attention_bias=False, mlp_bias=False)
    model = LlamaForCausalLM(cfg).eval()
    with torch.no_grad():
        for p in model.parameters():
            p.normal_(0.0, 0.2)
    letters = [chr(ord("a") + i) for i in range(26)]
    surfaces = [MARKER, "\n"] + letters + [MARKER + c for c in letters[:20]]
    manifest = export(model, None, out_dir, f"random-tiny-llama(seed={seed})")
    out = pathlib.Path(out_dir)
    write_vocab(out / "vocab.json", dict(enumerate(surfaces)))

    prompt = [0, 5, 9, 30, 2, 44, 17, 1, 28, 3, 40, 12]
    with torch.no_grad():
        logits = model(torch.tensor([prompt])).logits[0, -1].double().numpy()
    with open(out / "reference_logits.json", "w", encoding="utf-8") as f:
        json.dump({"token_ids": prompt, "final_logits": logits.tolist()}, f)
    return manifest


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    ex = sub.add_parser("export", help="export a Llama-family checkpoint and tokenizer")
    ex.add_argument("--model", required=True)
    ex.add_argument("--out", required=True)
    ex.add_argument("--pretokenize")
    rt = sub.add_parser("random-tiny", help="export a random tiny Llama with reference logits")
    rt.add_argument("--out", required=True)
    rt.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    try:
        if args.command == "export":
            from transformers import AutoModelForCausalLM, AutoTokenizer
            model = AutoModelForCausalLM.from_pretrained(args.model, torch_dtype="float32")
            tokenizer = AutoTokenizer.from_pretrained(args.model)
            export(model, tokenizer, args.out, args.model, args.pretokenize)
        else:
            random_tiny(args.out, args.seed)
    except (MappingError, UnsupportedArchitecture) as e:
        print(f"error [{type(e).__name__}]: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
