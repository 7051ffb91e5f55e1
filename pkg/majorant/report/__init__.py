"""Report serialization and published reference values."""
