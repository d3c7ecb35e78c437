"""Flag-algebra SDP construction, export and exact certificates."""
