"""majorant: certified numerics for the majorant property of three-term idempotents."""

__version__ = "0.1.0"
