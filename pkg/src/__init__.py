"""mmdlab: MMD estimation, concentration bounds and Monte-Carlo studies."""
