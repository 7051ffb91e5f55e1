"""Taylor models and proof orchestration."""
