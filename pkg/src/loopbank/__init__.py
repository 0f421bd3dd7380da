"""loopbank – paraunitary filter banks, polynomial unitary loops and their Cuntz-algebra representations."""

__version__ = "0.1.0"
