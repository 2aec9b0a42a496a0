"""Conditional VAE over feature curves with a recurrent/attention backbone.

The encoder consumes targets and melody jointly and parameterizes a Gaussian
posterior; the decoder rebuilds the three curves per step from the latent and
the melody, with a separate feed-forward head predicting the 24-class
tonality from the latent concatenated with a melody summary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import torch
import torch.nn.functional as F
from torch import nn

from .data import X_DIM, Y_DIM

LATENT_DIM = 64


@dataclass
class ModelConfig:
    latent_dim: int = LATENT_DIM
    hidden: int = 128
    attention_heads: int = 4
    dropout: float = 0.1
    learning_rate: float = 2e-3  # desk-scale working point; full-scale runs use 4e-4 at batch 256
    lr_gamma: float = 0.98
    batch_size: int = 64
    epochs: int = 15
    beta_warmup_epochs: int = 10
    beta_max: float = 0.01  # desk-scale working point; full-scale runs hold 1.0
    lambda_k: float = 0.1
    lambda_t: float = 1.0
    lambda_d: float = 1.0
    lambda_s: float = 1.0
    use_tonality_skip: bool = True
    use_attention: bool = True
    recurrent_core: str = "gru"  # "gru" | "attention"
    seed: int = 0

    def beta_at(self, epoch: int) -> float:
        if self.beta_warmup_epochs <= 0:
            return self.beta_max
        return self.beta_max * min(1.0, (epoch + 1) / self.beta_warmup_epochs)


class PositionalEncoding(nn.Module):
    def __init__(self, dim: int, max_len: int = 512):
        super().__init__()
        position = torch.arange(max_len).unsqueeze(1)
        div = torch.exp(torch.arange(0, dim, 2) * (-math.log(10000.0) / dim))
        pe = torch.zeros(max_len, dim)
        pe[:, 0::2] = torch.sin(position * div)
        pe[:, 1::2] = torch.cos(position * div[: pe[:, 1::2].shape[1]])
        self.register_buffer("pe", pe)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return x + self.pe[: x.shape[1]].unsqueeze(0)


class SequenceCore(nn.Module):
    """GRU over steps, or self-attention with positional encoding in the ablation."""

    def __init__(self, dim: int, config: ModelConfig):
        super().__init__()
        self.kind = config.recurrent_core
        if self.kind == "gru":
            self.gru = nn.GRU(dim, dim, batch_first=True)
        elif self.kind == "attention":
            self.pos = PositionalEncoding(dim)
            self.attn = nn.MultiheadAttention(dim, config.attention_heads, batch_first=True)
            self.norm = nn.LayerNorm(dim)
        else:
            raise ValueError(f"unknown recurrent core: {self.kind!r}")

    def forward(self, x: torch.Tensor, mask: torch.Tensor) -> torch.Tensor:
        if self.kind == "gru":
            out, _ = self.gru(x)
            return out
        h = self.pos(x)
        attended, _ = self.attn(h, h, h, key_padding_mask=mask < 0.5)
        return self.norm(h + attended)


class AttentionBlock(nn.Module):
    def __init__(self, dim: int, heads: int):
        super().__init__()
        self.attn = nn.MultiheadAttention(dim, heads, batch_first=True)
        self.norm = nn.LayerNorm(dim)

    def forward(self, x: torch.Tensor, mask: torch.Tensor) -> torch.Tensor:
        attended, _ = self.attn(x, x, x, key_padding_mask=mask < 0.5)
        return self.norm(x + attended)


def masked_mean(x: torch.Tensor, mask: torch.Tensor) -> torch.Tensor:
    weights = mask.unsqueeze(-1)
    return (x * weights).sum(dim=1) / weights.sum(dim=1).clamp(min=1.0)


class CurveGenerator(nn.Module):
    def __init__(self, config: ModelConfig | None = None):
        super().__init__()
        self.config = config or ModelConfig()
        c = self.config
        h = c.hidden

        self.encoder_in = nn.Linear(X_DIM + Y_DIM, h)
        self.encoder_core = SequenceCore(h, c)
        self.encoder_attn = AttentionBlock(h, c.attention_heads) if c.use_attention else None
        self.posterior = nn.Linear(h, 2 * c.latent_dim)

        self.melody_in = nn.Linear(Y_DIM, h)
        self.melody_core = SequenceCore(h, c)
        self.decoder_in = nn.Linear(h + c.latent_dim, h)
        self.decoder_core = SequenceCore(h, c)
        self.decoder_attn = AttentionBlock(h, c.attention_heads) if c.use_attention else None
        self.dropout = nn.Dropout(c.dropout)

        self.heads = nn.ModuleDict(
            {
                name: nn.Sequential(nn.Linear(h, h), nn.ReLU(), nn.Linear(h, 1))
                for name in ("tension", "distance", "strain")
            }
        )
        tonality_in = c.latent_dim + h if c.use_tonality_skip else h
        self.tonality_head = nn.Sequential(
            nn.Linear(tonality_in, h), nn.ReLU(), nn.Dropout(c.dropout), nn.Linear(h, 24)
        )

    def encode(self, x: torch.Tensor, y: torch.Tensor, mask: torch.Tensor):
        h = torch.relu(self.encoder_in(torch.cat([x, y], dim=-1)))
        h = self.encoder_core(h, mask)
        if self.encoder_attn is not None:
            h = self.encoder_attn(h, mask)
        pooled = masked_mean(h, mask)
        mu, log_var = self.posterior(pooled).chunk(2, dim=-1)
        log_var = log_var.clamp(-8.0, 8.0)
        return mu, log_var

    @staticmethod
    def sample(mu: torch.Tensor, log_var: torch.Tensor) -> torch.Tensor:
        return mu + torch.exp(0.5 * log_var) * torch.randn_like(mu)

    def decode(self, z: torch.Tensor, y: torch.Tensor, mask: torch.Tensor):
        melody = torch.relu(self.melody_in(y))
        melody = self.melody_core(melody, mask)
        steps = melody.shape[1]
        h = torch.relu(self.decoder_in(torch.cat([melody, z.unsqueeze(1).expand(-1, steps, -1)], dim=-1)))
        h = self.decoder_core(h, mask)
        if self.decoder_attn is not None:
            h = self.decoder_attn(h, mask)
        h = self.dropout(h)
        curves = {name: head(h).squeeze(-1) for name, head in self.heads.items()}

        melody_summary = masked_mean(melody, mask)
        if self.config.use_tonality_skip:
            tonality_logits = self.tonality_head(torch.cat([z, melody_summary], dim=-1))
        else:
            tonality_logits = self.tonality_head(melody_summary)
        return curves, tonality_logits

    def forward(self, batch: dict):
        mu, log_var = self.encode(batch["x"], batch["y"], batch["mask"])
        z = self.sample(mu, log_var)
        curves, tonality_logits = self.decode(z, batch["y"], batch["mask"])
        return curves, tonality_logits, mu, log_var


def loss_components(
    curves: dict[str, torch.Tensor],
    tonality_logits: torch.Tensor,
    batch: dict,
    mu: torch.Tensor,
    log_var: torch.Tensor,
) -> dict[str, torch.Tensor]:
    mask = batch["mask"]
    denom = mask.sum().clamp(min=1.0)
    out = {}
    for j, name in enumerate(("tension", "distance", "strain")):
        target = batch["x"][..., j]
        out[name] = (((curves[name] - target) ** 2) * mask).sum() / denom
    out["tonality"] = F.cross_entropy(tonality_logits, batch["tonality"])
    out["kl"] = (-0.5 * (1 + log_var - mu.pow(2) - log_var.exp())).sum(dim=-1).mean()
    return out


def total_loss(components: dict[str, torch.Tensor], config: ModelConfig, beta: float) -> torch.Tensor:
    return (
        beta * components["kl"]
        + config.lambda_k * components["tonality"]
        + config.lambda_t * components["tension"]
        + config.lambda_d * components["distance"]
        + config.lambda_s * components["strain"]
    )
