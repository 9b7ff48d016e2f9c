# Unit tests for graphcx components
