from django.dispatch import Signal

# Отправляется после инициализации (generation=0) и после каждого поколения.
# Аргументы: generation, positions, objective_values, best_objective.
generation_completed = Signal()
