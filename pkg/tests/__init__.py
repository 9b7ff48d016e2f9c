# Tests for graphcx
