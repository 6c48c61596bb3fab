"""Normal-form bisimulation workbench for the lambda calculus and its control extensions."""
