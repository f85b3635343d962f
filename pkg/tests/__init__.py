# Tests for limitgen
