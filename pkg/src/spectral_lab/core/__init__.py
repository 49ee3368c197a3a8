"""Core configuration and shared infrastructure."""
