"""Detection matching, P/R/F and the upper-bound protocol."""
