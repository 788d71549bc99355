"""imlw: a desk-scale imitation-learning workbench.

Simulated planar arm, episode datasets, scripted experts, a minimal autodiff
core, DDPM diffusion policies, checkpoint-sweep evaluation via the
Voting-Positive-Rate protocol, and timestamp-gated deployment.
"""

__version__ = "0.1.0"
