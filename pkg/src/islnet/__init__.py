"""Gesture classification for Indian Sign Language: preprocessing, a
from-scratch CNN, training, metrics, a CLI, and an HTTP inference service."""

__version__ = "0.1.0"
