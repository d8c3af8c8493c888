from django.utils.translation import gettext_lazy as _

BOA = 'boa'
GA = 'ga'
DE = 'de'

ALGORITHM_CHOICES = [
    (BOA, _('Butterfly Optimization Algorithm')),
    (GA, _('Genetic Algorithm')),
    (DE, _('Differential Evolution (rand/1/bin)')),
]

ALGORITHM_ORDER = [code for code, label in ALGORITHM_CHOICES]
