# Generated by Django 5.2.6 on 2026-10-17 09:12

import django.core.validators
import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='Session',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('name', models.CharField(max_length=100, unique=True, validators=[django.core.validators.RegexValidator('^[A-Za-z_][A-Za-z0-9_]*$', 'Names are identifiers: letters, digits and underscores.')])),
                ('description', models.TextField(blank=True)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('updated_at', models.DateTimeField(auto_now=True)),
            ],
            options={
                'verbose_name': 'Session',
                'verbose_name_plural': 'Sessions',
                'ordering': ['name'],
            },
        ),
        migrations.CreateModel(
            name='JobRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('job', models.CharField(max_length=200)),
                ('status', models.CharField(choices=[('PASS', 'All checks passed'), ('FAIL', 'A verification failed'), ('ERROR', 'Malformed input')], max_length=5)),
                ('report', models.TextField(blank=True)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('session', models.ForeignKey(blank=True, null=True, on_delete=django.db.models.deletion.SET_NULL, related_name='job_runs', to='workbench.session')),
            ],
            options={
                'verbose_name': 'Job run',
                'verbose_name_plural': 'Job runs',
                'ordering': ['-created_at'],
            },
        ),
        migrations.CreateModel(
            name='SessionObject',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('name', models.CharField(max_length=100, validators=[django.core.validators.RegexValidator('^[A-Za-z_][A-Za-z0-9_]*$', 'Names are identifiers: letters, digits and underscores.')])),
                ('kind', models.CharField(choices=[('operator', 'Operator'), ('word', 'Generator word'), ('triple', 'Bispectral triple')], max_length=10)),
                ('context', models.CharField(blank=True, help_text='Parse context, e.g. weyl or triple:airy:source', max_length=200)),
                ('text', models.TextField(help_text='Canonical printed form')),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('updated_at', models.DateTimeField(auto_now=True)),
                ('session', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='entries', to='workbench.session')),
            ],
            options={
                'verbose_name': 'Session object',
                'verbose_name_plural': 'Session objects',
                'ordering': ['session', 'name'],
                'unique_together': {('session', 'name')},
            },
        ),
    ]
