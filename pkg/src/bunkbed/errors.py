class CapExceededError(ValueError):
    """A requested size exceeds a configured enumeration or exact-mode cap."""
